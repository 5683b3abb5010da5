package fixtures.app;

import java.util.Random;
import javax.crypto.KeyGenerator;
import javax.crypto.SecretKey;

// Feeds a plain java.util.Random into key generation.
public class PredictableSeed {
    public SecretKey newKey() throws Exception {
        Random source = new Random();
        KeyGenerator generator = KeyGenerator.getInstance("AES");
        generator.init(256, source);
        SecretKey key = generator.generateKey();
        return key;
    }
}
