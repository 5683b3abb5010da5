package fixtures.app;

import javax.crypto.KeyGenerator;
import javax.crypto.Mac;
import javax.crypto.SecretKey;

// Authenticates messages with HMAC-MD5.
public class WeakHmac {
    public byte[] tag(byte[] message) throws Exception {
        KeyGenerator generator = KeyGenerator.getInstance("HmacSHA256");
        SecretKey key = generator.generateKey();
        Mac mac = Mac.getInstance("HmacMD5");
        mac.init(key);
        byte[] tag = mac.doFinal(message);
        return tag;
    }
}
