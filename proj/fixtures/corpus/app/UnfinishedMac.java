package fixtures.app;

import javax.crypto.KeyGenerator;
import javax.crypto.Mac;
import javax.crypto.SecretKey;

// Fills a MAC with data but never asks for the tag.
public class UnfinishedMac {
    public void authenticate(byte[] message) throws Exception {
        KeyGenerator generator = KeyGenerator.getInstance("AES");
        SecretKey key = generator.generateKey();
        Mac mac = Mac.getInstance("HmacSHA256");
        mac.init(key);
        mac.update(message);
    }
}
